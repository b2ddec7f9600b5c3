#pragma once

#include <cstddef>
#include <span>

namespace bcs {

// Orthonormal Daubechies scaling (lowpass synthesis) filters, canonical
// ordering, normalized so the coefficients sum to sqrt(2). Index p is the
// number of vanishing moments; the filter has 2p taps.

inline constexpr double kDaubechies2[2] = {
    +7.07106781186547573e-01,    +7.07106781186547573e-01,
};

inline constexpr double kDaubechies4[4] = {
    +4.82962913144534156e-01,    +8.36516303737807942e-01,
    +2.24143868042013389e-01,    -1.29409522551260370e-01,
};

inline constexpr double kDaubechies6[6] = {
    +3.32670552950082632e-01,    +8.06891509311092547e-01,
    +4.59877502118491543e-01,    -1.35011020010254584e-01,
    -8.54412738820266582e-02,    +3.52262918857095333e-02,
};

inline constexpr double kDaubechies8[8] = {
    +2.30377813308896506e-01,    +7.14846570552915672e-01,
    +6.30880767929858921e-01,    -2.79837694168598543e-02,
    -1.87034811719093086e-01,    +3.08413818355607640e-02,
    +3.28830116668851966e-02,    -1.05974017850690317e-02,
};

inline constexpr double kDaubechies10[10] = {
    +1.60102397974192928e-01,    +6.03829269797189649e-01,
    +7.24308528437772936e-01,    +1.38428145901320743e-01,
    -2.42294887066382025e-01,    -3.22448695846383748e-02,
    +7.75714938400457188e-02,    -6.24149021279827437e-03,
    -1.25807519990819988e-02,    +3.33572528547377125e-03,
};

inline constexpr double kDaubechies12[12] = {
    +1.11540743350109467e-01,    +4.94623890398453059e-01,
    +7.51133908021095364e-01,    +3.15250351709197629e-01,
    -2.26264693965439828e-01,    -1.29766867567261940e-01,
    +9.75016055873230425e-02,    +2.75228655303057269e-02,
    -3.15820393174860298e-02,    +5.53842201161496126e-04,
    +4.77725751094551076e-03,    -1.07730108530847959e-03,
};

inline constexpr double kDaubechies14[14] = {
    +7.78520540850091841e-02,    +3.96539319481917285e-01,
    +7.29132090846235092e-01,    +4.69782287405193122e-01,
    -1.43906003928564979e-01,    -2.24036184993874982e-01,
    +7.13092192668302594e-02,    +8.06126091510830783e-02,
    -3.80299369350144134e-02,    -1.65745416306668815e-02,
    +1.25509985560998405e-02,    +4.29577972921366515e-04,
    -1.80164070404749085e-03,    +3.53713799974520241e-04,
};

inline constexpr double kDaubechies16[16] = {
    +5.44158422431040081e-02,    +3.12871590914299946e-01,
    +6.75630736297289758e-01,    +5.85354683654206731e-01,
    -1.58291052563493059e-02,    -2.84015542961546907e-01,
    +4.72484573913282469e-04,    +1.28747426620478472e-01,
    -1.73693010018075474e-02,    -4.40882539307947546e-02,
    +1.39810279173982824e-02,    +8.74609404740577662e-03,
    -4.87035299345157414e-03,    -3.91740373376947050e-04,
    +6.75449406450569331e-04,    -1.17476784124769535e-04,
};

inline constexpr double kDaubechies18[18] = {
    +3.80779473638783450e-02,    +2.43834674612590341e-01,
    +6.04823123690111153e-01,    +6.57288078051300517e-01,
    +1.33197385825007564e-01,    -2.93273783279174916e-01,
    -9.68407832229764565e-02,    +1.48540749338106376e-01,
    +3.07256814793333798e-02,    -6.76328290613299743e-02,
    +2.50947114831451973e-04,    +2.23616621236790956e-02,
    -4.72320475775139716e-03,    -4.28150368246343026e-03,
    +1.84764688305622655e-03,    +2.30385763523195973e-04,
    -2.51963188942710124e-04,    +3.93473203162716026e-05,
};

inline constexpr double kDaubechies20[20] = {
    +2.66700579005555542e-02,    +1.88176800077691497e-01,
    +5.27201188931725628e-01,    +6.88459039453603538e-01,
    +2.81172343660577473e-01,    -2.49846424327315381e-01,
    -1.95946274377377050e-01,    +1.27369340335793252e-01,
    +9.30573646035723484e-02,    -7.13941471663970817e-02,
    -2.94575368218758134e-02,    +3.32126740593410019e-02,
    +3.60655356695616970e-03,    -1.07331754833305745e-02,
    +1.39535174705290128e-03,    +1.99240529518505613e-03,
    -6.85856694959711619e-04,    -1.16466855129285449e-04,
    +9.35886703200695919e-05,    -1.32642028945212443e-05,
};

inline constexpr double kDaubechies22[22] = {
    +1.86942977614710827e-02,    +1.44067021150624502e-01,
    +4.49899764356045340e-01,    +6.85686774916200559e-01,
    +4.11964368947907444e-01,    -1.62275245027490356e-01,
    -2.74230846817946960e-01,    +6.60435881966831839e-02,
    +1.49812012466378486e-01,    -4.64799551166841865e-02,
    -6.64387856950252043e-02,    +3.13350902190460759e-02,
    +2.08409043601810624e-02,    -1.53648209062015994e-02,
    -3.34085887301444583e-03,    +4.92841765605904134e-03,
    -3.08592858815143190e-04,    -8.93023250666264605e-04,
    +2.49152523552823480e-04,    +5.44390746993684746e-05,
    -3.46349841869849956e-05,    +4.49427427723651031e-06,
};

inline constexpr double kDaubechies24[24] = {
    +1.31122579572295183e-02,    +1.09566272821185154e-01,
    +3.77355135214212656e-01,    +6.57198722579307115e-01,
    +5.15886478427815653e-01,    -4.47638856537746280e-02,
    -3.16178453752785527e-01,    -2.37792572560697330e-02,
    +1.82478605927579696e-01,    +5.35956967435214249e-03,
    -9.64321200965070763e-02,    +1.08491302558221814e-02,
    +4.15462774950844452e-02,    -1.22186490697482816e-02,
    -1.28408251983006833e-02,    +6.71149900879550870e-03,
    +2.24860724099523778e-03,    -2.17950361862776030e-03,
    +6.54512821250959501e-06,    +3.88653062820931434e-04,
    -8.85041092082043202e-05,    -2.42415457570307852e-05,
    +1.27769522193797666e-05,    -1.52907175806851093e-06,
};

inline constexpr double kDaubechies26[26] = {
    +9.20213353896236728e-03,    +8.28612438729027789e-02,
    +3.11996322160438044e-01,    +6.11055851158787688e-01,
    +5.88889570431218923e-01,    +8.69857261796472409e-02,
    -3.14972907711388639e-01,    -1.24576730750815254e-01,
    +1.79476079429339852e-01,    +7.29489336567771540e-02,
    -1.05807618187934327e-01,    -2.64884064753436975e-02,
    +5.61394771002834275e-02,    +2.37997225405907906e-03,
    -2.38314207103236496e-02,    +3.92394144879741700e-03,
    +7.25558940161756625e-03,    -2.76191123465686222e-03,
    -1.31567391189229893e-03,    +9.32326130867263347e-04,
    +4.92515251262894642e-05,    -1.65128988556505489e-04,
    +3.06785375793254965e-05,    +1.04419305714081377e-05,
    -4.70041647936086831e-06,    +5.22003509845486436e-07,
};

inline constexpr double kDaubechies28[28] = {
    +6.46115346008794764e-03,    +6.23647588493988977e-02,
    +2.54850267792621377e-01,    +5.54305617940893836e-01,
    +6.31187849104856813e-01,    +2.18670687758906523e-01,
    -2.71688552278748052e-01,    -2.18033529993276048e-01,
    +1.38395213864806577e-01,    +1.39989016584460696e-01,
    -8.67484115681696893e-02,    -7.15489555040461356e-02,
    +5.52371262592160558e-02,    +2.69814083079129088e-02,
    -3.01853515403906307e-02,    -5.61504953035696017e-03,
    +1.27894932663334092e-02,    -7.46218989268385082e-04,
    -3.84963886802218739e-03,    +1.06169108560676172e-03,
    +7.08021154235527863e-04,    -3.86831947312954504e-04,
    -4.17772457703725965e-05,    +6.87550425269750935e-05,
    -1.03372091845707742e-05,    -4.38970490178139422e-06,
    +1.72499467536781268e-06,    -1.78713996831135919e-07,
};

inline constexpr double kDaubechies30[30] = {
    +4.53853736157889924e-03,    +4.67433948927662712e-02,
    +2.06023863986995737e-01,    +4.92631771708139599e-01,
    +6.45813140357424320e-01,    +3.39002535454731524e-01,
    -1.93204139609145426e-01,    -2.88882596566965633e-01,
    +6.52829528487728072e-02,    +1.90146714007122991e-01,
    -3.96661765557909593e-02,    -1.11120936037231680e-01,
    +3.38771439235076785e-02,    +5.47805505845076202e-02,
    -2.57670073284399608e-02,    -2.08100501696930860e-02,
    +1.50839180278359072e-02,    +5.10100036040754025e-03,
    -6.48773456031574366e-03,    -2.41756490761624922e-04,
    +1.94332398038221167e-03,    -3.73482354137617031e-04,
    -3.59565244362468795e-04,    +1.55896489920599762e-04,
    +2.57926991553189358e-05,    -2.81332962660478136e-05,
    +3.36298718173758000e-06,    +1.81127040794057719e-06,
    -6.31688232588166450e-07,    +6.13335991330575202e-08,
};

inline constexpr double kDaubechies32[32] = {
    +3.18922092534773809e-03,    +3.49077143236733445e-02,
    +1.65064283488853131e-01,    +4.30312722846003803e-01,
    +6.37356332083788946e-01,    +4.40290256886356923e-01,
    -8.97510894024896450e-02,    -3.27063310527917706e-01,
    -2.79182081330282827e-02,    +2.11190693947104297e-01,
    +2.73402637527160181e-02,    -1.32388305563810371e-01,
    -6.23972275247489279e-03,    +7.59242360442763248e-02,
    -7.58897436885774563e-03,    -3.68883976917301348e-02,
    +1.02976596409559609e-02,    +1.39937688598287379e-02,
    -6.99001456341392068e-03,    -3.64427962149838861e-03,
    +3.12802338120626855e-03,    +4.07896980849712688e-04,
    -9.41021749359567455e-04,    +1.14241520038722337e-04,
    +1.74787245225338197e-04,    -6.10359662141093598e-05,
    -1.39456689882088926e-05,    +1.13366086612762581e-05,
    -1.04357134231160655e-06,    -7.36365678545120508e-07,
    +2.30878408685754574e-07,    -2.10933963010074312e-08,
};

inline constexpr double kDaubechies34[34] = {
    +2.24180700103731277e-03,    +2.59853937036060439e-02,
    +1.31214903307824399e-01,    +3.70350724152641142e-01,
    +6.10996615684622824e-01,    +5.18315764056937800e-01,
    +2.73149704032936355e-02,    -3.28320748363961745e-01,
    -1.26599752215882710e-01,    +1.97310589565010991e-01,
    +1.01135489177470256e-01,    -1.26815691778286277e-01,
    -5.70914196316769720e-02,    +8.11059866541609387e-02,
    +2.23123361781037526e-02,    -4.69224383892697106e-02,
    -3.27095553581930589e-03,    +2.27336765839462746e-02,
    -3.04298998135463673e-03,    -8.60292152032285720e-03,
    +2.96799669152609602e-03,    +2.30120524215354479e-03,
    -1.43684530480297557e-03,    -3.28132519409838187e-04,
    +4.39465427768643744e-04,    -2.56101095665484716e-05,
    -8.20480320245339150e-05,    +2.31868137987459522e-05,
    +6.99060098507675146e-06,    -4.50594247722298836e-06,
    +3.01654960999455729e-07,    +2.95770093331685689e-07,
    -8.42394844600267961e-08,    +7.26749296856160849e-09,
};

inline constexpr double kDaubechies36[36] = {
    +1.57631021844076053e-03,    +1.92885317241463759e-02,
    +1.03588465822423592e-01,    +3.14678941337031726e-01,
    +5.71826807766607215e-01,    +5.71801654888651312e-01,
    +1.47223111969928155e-01,    -2.93654040736558763e-01,
    -2.16480934005142955e-01,    +1.49533975565377786e-01,
    +1.67081312763257439e-01,    -9.23318841508463245e-02,
    -1.06752246659828437e-01,    +6.48872162119053797e-02,
    +5.70512477385369601e-02,    -4.45261419029824024e-02,
    -2.37332103958599328e-02,    +2.66707059264705421e-02,
    +6.26216795430573590e-03,    -1.30514809466120169e-02,
    +1.18630033858125228e-04,    +4.94334360546673426e-03,
    -1.11873266699249498e-03,    -1.34059629833610766e-03,
    +6.28465682965146061e-04,    +2.13581561910340564e-04,
    -1.98648552311747931e-04,    -1.53591712353476038e-07,
    +3.74123788074003850e-05,    -8.52060253744669425e-06,
    -3.33263447888582197e-06,    +1.76871298362761550e-06,
    -7.69163268988517661e-08,    -1.17609876702823172e-07,
    +3.06883586304517494e-08,    -2.50793445494859831e-09,
};

inline constexpr double kDaubechies38[38] = {
    +1.10866976318171060e-03,    +1.42810984507643970e-02,
    +8.12781132654595562e-02,    +2.64388431740896768e-01,
    +5.24436377464654879e-01,    +6.01704549127537902e-01,
    +2.60894952651038847e-01,    -2.28091394215482635e-01,
    -2.85838631755826245e-01,    +7.46522697081033332e-02,
    +2.12349743306278343e-01,    -3.35185419023026065e-02,
    -1.42785695038736893e-01,    +2.75843506256289416e-02,
    +8.69067555558121069e-02,    -2.65012362501230413e-02,
    -4.56742262772308477e-02,    +2.16237674095849861e-02,
    +1.93755498891761586e-02,    -1.39883886785351526e-02,
    -5.86692228101217458e-03,    +7.04074736710524462e-03,
    +7.68954359257547401e-04,    -2.68755180070158169e-03,
    +3.41808653458595534e-04,    +7.35802520505435330e-04,
    -2.60676135678628051e-04,    -1.24600791734158777e-04,
    +8.71127046721992292e-05,    +5.10595048707388454e-06,
    -1.66401762971549446e-05,    +3.01096431629652611e-06,
    +1.53193147669119301e-06,    -6.86275565776914270e-07,
    +1.44708829879784453e-08,    +4.63693777578260454e-08,
    -1.11640206703582589e-08,    +8.66684883899761893e-10,
};

inline constexpr double kDaubechies40[40] = {
    +7.79953613666846293e-04,    +1.05493946249503989e-02,
    +6.34237804590815218e-02,    +2.19942113551397034e-01,
    +4.72696185310901684e-01,    +6.10493238938593863e-01,
    +3.61502298739331041e-01,    -1.39212088011483881e-01,
    -3.26786800434034963e-01,    -1.67270883090770289e-02,
    +2.28291050819916352e-01,    +3.98502464577711948e-02,
    -1.55458750707267945e-01,    -2.47168273386136270e-02,
    +1.02291719174442644e-01,    +5.63224685730736793e-03,
    -6.17228996246804509e-02,    +5.87468181181186912e-03,
    +3.22942995307695380e-02,    -8.78932492390154495e-03,
    -1.38105261371519062e-02,    +6.72162730225943101e-03,
    +4.42054238704581420e-03,    -3.58149425960963778e-03,
    -8.31562172822549665e-04,    +1.39255961932313382e-03,
    -5.34975984399763791e-05,    -3.85104748699217577e-04,
    +1.01532889736702815e-04,    +6.77428082837773417e-05,
    -3.71058618339471487e-05,    -4.37614386218399206e-06,
    +7.24124828767361963e-06,    -1.01199401001888596e-06,
    -6.84707959700055740e-07,    +2.63392422627000128e-07,
    +2.01432202355051368e-10,    -1.81484324829969604e-08,
    +4.05612705555183281e-09,    -2.99883648961931942e-10,
};

/// Scaling filter by tap count (even, 2..40); empty span if unavailable.
inline std::span<const double> daubechies_scaling_filter(int taps) {
    switch (taps) {
        case 2: return kDaubechies2;
        case 4: return kDaubechies4;
        case 6: return kDaubechies6;
        case 8: return kDaubechies8;
        case 10: return kDaubechies10;
        case 12: return kDaubechies12;
        case 14: return kDaubechies14;
        case 16: return kDaubechies16;
        case 18: return kDaubechies18;
        case 20: return kDaubechies20;
        case 22: return kDaubechies22;
        case 24: return kDaubechies24;
        case 26: return kDaubechies26;
        case 28: return kDaubechies28;
        case 30: return kDaubechies30;
        case 32: return kDaubechies32;
        case 34: return kDaubechies34;
        case 36: return kDaubechies36;
        case 38: return kDaubechies38;
        case 40: return kDaubechies40;
        default: return {};
    }
}

}  // namespace bcs
